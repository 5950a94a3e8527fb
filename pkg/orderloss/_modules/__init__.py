""" pluggable modules of orderloss; each kind has a parent class in _<kind>.py """
