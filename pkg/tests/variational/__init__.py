# ABOUTME: Variational tests package
# ABOUTME: Mirrors app/variational
