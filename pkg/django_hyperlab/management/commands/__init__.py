"""
Management commands for django-hyperlab.
"""
