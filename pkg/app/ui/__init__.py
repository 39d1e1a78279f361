# ABOUTME: UI package - static SVG charts of conditioning and error curves
# ABOUTME: Charts are plain strings so the CLI can write them next to CSV output
