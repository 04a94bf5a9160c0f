"""Experiment orchestration: domains, runs, datasets and comparisons."""
