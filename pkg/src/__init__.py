"""Self-paced multi-task clustering toolkit."""
