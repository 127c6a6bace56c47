# src/l1sections/kerdock/__init__.py
