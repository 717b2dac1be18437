# CLI modules
