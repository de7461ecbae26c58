/** Where the test service listens; kept in one place for setup and tests. */
export const TEST_PORT = 8771;
export const TEST_API = `http://127.0.0.1:${TEST_PORT}`;
