# Unit tests for orchestrator and other components
