"""
Tests for file reading and writing.
"""
