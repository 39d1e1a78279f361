# ABOUTME: Systems tests package
# ABOUTME: Mirrors app/systems
