# ABOUTME: Conditioning tests package
# ABOUTME: Mirrors app/conditioning
