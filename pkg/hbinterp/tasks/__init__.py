"""Built-in tasks, discovered by the TaskRegistry."""
