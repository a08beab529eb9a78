# Consistency module: oracle verdicts and subset enumeration
