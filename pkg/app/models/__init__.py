# Model schemas
