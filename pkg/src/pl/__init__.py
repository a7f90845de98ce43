"""
Presentation layer: emitters and templates.
"""
