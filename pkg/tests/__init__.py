"""Tests for Conic Farkas."""
