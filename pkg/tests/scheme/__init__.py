"""
Tests for time stepping and simulation runs.
"""
