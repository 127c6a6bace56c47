# src/l1sections/sensing/__init__.py
