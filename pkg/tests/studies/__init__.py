# ABOUTME: Studies tests package
# ABOUTME: Mirrors app/studies
