# app/infrastructure/reporting/__init__.py
