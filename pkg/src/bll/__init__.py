"""
Business logic: resolution, extraction, validation, derivation and transformation services.
"""
