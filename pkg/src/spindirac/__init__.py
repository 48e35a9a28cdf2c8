"""spindirac package."""
