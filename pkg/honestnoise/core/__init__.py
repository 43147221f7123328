# Core numerics package
