"""Deciding k-block determinism of regular languages."""
