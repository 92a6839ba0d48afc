// pattern: P8 SleepingReceiver
// expected: no-deadlock
package main

import (
	"fmt"
	"time"
)

func main() {
	ch := make(chan int)
	done := make(chan bool)
	go func() {
		fmt.Println(<-ch)
		done <- true
	}()
	time.Sleep(100 * time.Millisecond)
	ch <- 1
	<-done
}
