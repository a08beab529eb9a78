# Paradeduction module: paradeducibility and maximal-subset consequences
