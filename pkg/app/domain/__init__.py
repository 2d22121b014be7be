# app/domain/__init__.py