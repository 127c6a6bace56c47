# src/l1sections/algebra/__init__.py
