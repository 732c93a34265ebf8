"""alcove_lab: root systems, alcoves, strict tessellation, exact spectra."""

__version__ = "0.1.0"
