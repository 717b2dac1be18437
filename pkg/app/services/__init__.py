# Service modules
