# app/container/__init__.py