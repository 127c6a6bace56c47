# src/l1sections/analysis/__init__.py
