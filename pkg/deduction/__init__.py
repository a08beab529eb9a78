# Deduction module: S-deductions, closure and witness verification
