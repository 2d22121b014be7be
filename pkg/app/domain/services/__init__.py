# app/domain/services/__init__.py
