# ABOUTME: Export package - CSV tables and JSON reports for study results
# ABOUTME: Floats are written with 17 significant digits so values round-trip
