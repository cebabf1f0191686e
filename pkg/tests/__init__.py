"""Tests for the sonic-patch solver."""
