# ABOUTME: Integrators tests package
# ABOUTME: Mirrors app/integrators
