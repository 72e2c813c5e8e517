"""Exact enumeration oracle for small n and k."""
