"""JSON schemas for the documents this package reads and writes."""
