namespace fillfn {}
