"""Temperley-Lieb algebras, extremal traces and trace-induced inner products."""
