ENV_PREFIX = "QUIETWIN_"
DOTENV_FILES = (".env", ".env.dev")

CSV_DECIMALS = 6
