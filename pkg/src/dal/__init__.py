"""
Data access: DSL, corpus and word-list files.
"""
