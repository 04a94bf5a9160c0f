"""On-disk run directories."""
