"""
Tests for the saddle point system and inf-sup estimates.
"""
