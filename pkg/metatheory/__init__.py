# Metatheory module: executable metatheorem battery
