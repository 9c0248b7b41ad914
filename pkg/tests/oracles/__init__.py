"""Reference values computed independently of the package under test."""
