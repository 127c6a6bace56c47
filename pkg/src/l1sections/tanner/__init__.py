# src/l1sections/tanner/__init__.py
