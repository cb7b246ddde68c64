"""
Tests for fluid and solid meshes.
"""
