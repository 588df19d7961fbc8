"""Toeplitz subshift X_w and its endomorphism group."""
