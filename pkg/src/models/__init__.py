"""
eLEL metamodel and UML class-diagram target model.
"""
