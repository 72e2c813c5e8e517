"""Pipeline scripts for relentropy."""
