"""Tests for django-hyperlab."""
