"""
Tests for assembly of bilinear forms and loads.
"""
