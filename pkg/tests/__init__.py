"""
Test suite for secretary_cutoffs
"""
