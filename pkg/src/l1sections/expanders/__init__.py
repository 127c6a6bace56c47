# src/l1sections/expanders/__init__.py
