# Presets module: shipped system definitions
