# ABOUTME: Export tests package
# ABOUTME: Mirrors app/export
