# ABOUTME: Test package for the conditioning toolkit
# ABOUTME: Unit tests mirror app/, slow acceptance runs live in integration/
