"""
Tests for manufactured solutions, error norms and refinement studies.
"""
