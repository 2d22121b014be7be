# app/config/__init__.py