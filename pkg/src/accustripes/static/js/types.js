/** Wire types mirroring the service JSON schema, consumed verbatim. */
export {};
