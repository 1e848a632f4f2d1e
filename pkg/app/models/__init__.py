"""Pydantic models for profiles, reports and output documents."""
