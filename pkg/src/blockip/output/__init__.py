"""Report schema and text output."""
