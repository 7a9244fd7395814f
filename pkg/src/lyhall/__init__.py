"""Free Lie-Yamaguti algebras: Hall-type basis, normal forms and certification."""
