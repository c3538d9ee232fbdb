# Wronsk numerical engines package
