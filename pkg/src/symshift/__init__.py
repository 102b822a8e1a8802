"""Symbolic dynamics of symmetric q-shifts and univoque bases."""
