# ABOUTME: UI tests package
# ABOUTME: Contains tests for SVG chart rendering
