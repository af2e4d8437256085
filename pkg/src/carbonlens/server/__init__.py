from carbonlens.server.app import ServerConfig, ServerState, create_app

__all__ = ["ServerConfig", "ServerState", "create_app"]
