"""Bundled example datasets."""
