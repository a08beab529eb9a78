# Valuation module: semantic consequence and adequacy
