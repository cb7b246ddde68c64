"""
Tests for reference elements, quadrature and finite element spaces.
"""
