"""Versioned fixture catalog resources."""
