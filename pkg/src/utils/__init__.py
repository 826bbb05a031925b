"""Terminal tables and progress bars for the command line."""
