# ABOUTME: Integration test package
# ABOUTME: Long-horizon runs over the built-in systems, marked `integration`
