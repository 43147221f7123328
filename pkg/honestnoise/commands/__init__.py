# Sub-command package
