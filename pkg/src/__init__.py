"""
eLEL lexicon compiler package.
"""
