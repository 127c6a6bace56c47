# src/l1sections/storage/__init__.py
