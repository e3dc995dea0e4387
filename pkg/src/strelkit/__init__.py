"""Executable string-algebra and linear-relation calculus."""
