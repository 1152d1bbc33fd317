# Settings and bundled study configurations
