"""Unit tests for hbinterp."""
