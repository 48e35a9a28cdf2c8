"""Schema assets and helpers for run configurations and reports."""
