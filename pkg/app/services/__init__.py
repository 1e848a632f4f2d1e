"""Output services (document rendering and parsing)."""
