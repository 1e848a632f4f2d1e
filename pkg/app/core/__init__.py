"""Core modules for configuration and errors."""
