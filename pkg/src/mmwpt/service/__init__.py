"""HTTP service exposing the sweep runners (see ``mmwpt.service.app``)."""
