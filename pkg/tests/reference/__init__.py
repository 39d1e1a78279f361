# ABOUTME: Reference tests package
# ABOUTME: Mirrors app/reference
