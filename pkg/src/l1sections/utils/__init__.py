# src/l1sections/utils/__init__.py
