"""Shared utilities: settings, logging, errors and seeding."""
