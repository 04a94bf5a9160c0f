"""Configuration schemas and report metrics."""
